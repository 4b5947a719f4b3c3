__name__ = 'HoloKnot'
__version__ = '0.3.0'
__description__ = "HoloKnot computes the quantized Chern-Simons invariant of a knot " \
                  "as a state sum and as a sum of state integrals, and solves the " \
                  "classical segment equations for volumes and Chern-Simons invariants."
__website__ = ''
