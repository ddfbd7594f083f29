# Landscape services
