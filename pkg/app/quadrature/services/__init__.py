# Quadrature services
