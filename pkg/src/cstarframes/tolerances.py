"""Default numerical tolerances.

All are relative unless noted. Every public function that uses one accepts a
``tol`` keyword; ``None`` selects the default below.
"""

HERMITIAN = 1e-10
POSITIVITY = 1e-10
INVERTIBILITY = 1e-12
#: absolute threshold on the dual residual norm
DUAL = 1e-9
#: central-element test, relative to the block norm
CENTRALITY = 1e-12


def pick(tol, default):
    return default if tol is None else float(tol)
