import numpy as np


def psd_quadratic_roots(p, q, c, product=None):
    """Roots of ``(x - p)(x - q) - c`` for ``p, q, c >= 0``, larger first.

    The larger root is formed without cancellation; the smaller one comes
    from the product of roots (``p q - c`` unless ``product`` is given).
    Works elementwise on arrays.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c = np.asarray(c, dtype=float)
    disc = (p - q) ** 2 + 4.0 * c
    big = 0.5 * (p + q + np.sqrt(disc))
    prod = p * q - c if product is None else np.asarray(product, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big > 0, prod / np.where(big > 0, big, 1.0), 0.0)
    return big, np.maximum(small, 0.0)
