# SO(3) services
