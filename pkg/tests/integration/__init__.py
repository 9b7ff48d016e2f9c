# Integration tests across complexes and maps
