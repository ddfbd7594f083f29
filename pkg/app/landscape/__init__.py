# Landscape package
