# Forest-cut toolkit tests
