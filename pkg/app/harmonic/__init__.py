# Harmonic fields package
