# Harmonic services
