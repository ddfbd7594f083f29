# Harmonic responses
