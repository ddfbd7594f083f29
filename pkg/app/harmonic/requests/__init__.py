# Harmonic requests
