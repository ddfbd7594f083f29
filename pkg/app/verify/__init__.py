# Acceptance suite
