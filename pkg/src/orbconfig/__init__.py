"""orbconfig: exact tools for orbit configuration spaces.

Subpackages cover exact scalars (Q, Q(zeta_m), complex points), planar group
actions and their quotient 2-orbifolds, orbit configuration predicates and
samplers, hyperplane arrangement invariants, branched covering verification,
a quasifibration obstruction, and finite groupoid models.
"""

__version__ = "0.1.0"
