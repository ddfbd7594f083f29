# Boundary requests
