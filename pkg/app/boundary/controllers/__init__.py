# Boundary controllers
