# Landscape models
