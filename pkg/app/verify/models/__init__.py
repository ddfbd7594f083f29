# Verification models
