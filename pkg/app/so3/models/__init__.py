# SO(3) models
