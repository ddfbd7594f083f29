# Boundary models
