#pragma once

#define TOWERKIT_VERSION "0.1.0"
