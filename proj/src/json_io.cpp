namespace towerkit {}
