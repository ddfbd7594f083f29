# Reduced energy on the parameter space
