# Boundary responses
