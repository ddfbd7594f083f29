# Boundary services
