# Landscape responses
