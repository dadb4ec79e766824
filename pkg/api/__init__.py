# cubeknot HTTP API package
