# Harmonic controllers
