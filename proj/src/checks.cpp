// placeholder, filled in with the experiment driver
