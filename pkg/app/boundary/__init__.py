# Boundary data package
