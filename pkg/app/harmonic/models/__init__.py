# Harmonic models
