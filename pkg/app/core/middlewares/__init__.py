# Middleware exports
