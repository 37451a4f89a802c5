"""Adversary policy: noisy best response on the probability simplex"""
import numpy as np


def best_response(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vertex e_j maximizing x^T A y; lowest index wins ties"""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    scores = A.T @ x
    response = np.zeros(A.shape[1])
    response[int(np.argmax(scores))] = 1.0
    return response


def sample_simplex_uniform(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the simplex via normalized exponential spacings"""
    if n < 1:
        raise ValueError("n must be >= 1")
    spacings = -np.log(1.0 - rng.random(n))
    total = spacings.sum()
    if total <= 0.0:
        return np.full(n, 1.0 / n)
    return spacings / total


def adversary_move(A: np.ndarray, x: np.ndarray, rng: np.random.Generator, mix: float = 0.8) -> np.ndarray:
    """mix * best_response(A, x) + (1 - mix) * uniform simplex noise"""
    if not 0.0 <= mix <= 1.0:
        raise ValueError("mix must lie in [0, 1]")
    noise = sample_simplex_uniform(A.shape[1], rng)
    return mix * best_response(A, x) + (1.0 - mix) * noise
