import numpy as np

from ..errors import ToleranceNotMet


def midpoint(f, a, b, n):
    """Composite midpoint rule with ``n`` cells; ``f`` must accept arrays."""
    h = (b - a) / n
    t = a + h * (np.arange(n) + 0.5)
    return np.sum(f(t)) * h


def integrate(f, a, b, rtol=1e-8, atol=1e-14, n0=64, max_nodes=2 ** 20):
    """Integrate ``f`` over [a, b].

    ``f`` is either a vectorised callable or an array of samples taken at the
    midpoints of a uniform partition of [a, b] (then the plain midpoint sum
    is returned). For callables the midpoint rule is run on successively
    doubled partitions and Richardson-extrapolated (error ~ h^2); iteration
    stops when two consecutive extrapolants agree to
    ``max(rtol * |I|, atol)``. Raises ToleranceNotMet past ``max_nodes``.
    """
    if not a < b:
        raise ValueError("need a < b")
    if not callable(f):
        samples = np.asarray(f)
        return complex(np.sum(samples) * (b - a) / samples.size)

    n = n0
    m_prev = midpoint(f, a, b, n)
    r_cur, r_prev = m_prev, None
    while True:
        n *= 2
        if n > max_nodes:
            err = abs(r_cur - r_prev) if r_prev is not None else np.inf
            raise ToleranceNotMet(
                f"midpoint/Richardson did not reach rtol={rtol} "
                f"with {max_nodes} nodes", estimate=r_cur, error=err)
        m_cur = midpoint(f, a, b, n)
        r_cur = (4.0 * m_cur - m_prev) / 3.0
        if r_prev is not None:
            err = abs(r_cur - r_prev)
            if err <= max(rtol * abs(r_cur), atol):
                return complex(r_cur)
        r_prev, m_prev = r_cur, m_cur
