# SO(3) critical-point theory
