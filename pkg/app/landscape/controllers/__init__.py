# Landscape controllers
