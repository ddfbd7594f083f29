# Reduced model
