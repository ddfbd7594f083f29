# Boundary repositories
