# Landscape requests
