# Reduced model services
