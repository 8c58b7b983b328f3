import numpy as np


def central_difference(loss_fn, array, h=1e-5):
    """Central finite-difference gradient of loss_fn() w.r.t. every entry
    of ``array`` (perturbed in place and restored)."""
    grad = np.zeros_like(array)
    it = np.nditer(array, flags=["multi_index"])
    while not it.finished:
        idx = it.multi_index
        orig = array[idx]
        array[idx] = orig + h
        plus = loss_fn()
        array[idx] = orig - h
        minus = loss_fn()
        array[idx] = orig
        grad[idx] = (plus - minus) / (2.0 * h)
        it.iternext()
    return grad


def relative_error(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.abs(a) + np.abs(b), 1e-8)
