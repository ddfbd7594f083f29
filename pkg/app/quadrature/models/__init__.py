# Quadrature models
