"""Seed derivation for reproducible Monte Carlo.

Every stream is a Philox counter-based generator keyed by a ``SeedSequence``.
Trial ``k`` of an experiment with master seed ``s`` always draws from
``derive(s, k)``, so results do not depend on how trials are scheduled.
"""

import numpy as np

TRIAL_STREAM = 0
AUX_STREAM = 1


def derive(master_seed, k):
    """Sub-seed for trial ``k``."""
    return (int(master_seed), TRIAL_STREAM, int(k))


def aux_seed(master_seed, j=0):
    """Sub-seed for auxiliary draws not tied to a trial (e.g. Rand(n))."""
    return (int(master_seed), AUX_STREAM, int(j))


def make_rng(seed):
    """Build a Generator from an int seed or a derived tuple seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (tuple, list)):
        ss = np.random.SeedSequence(int(seed[0]), spawn_key=tuple(int(s) for s in seed[1:]))
    else:
        ss = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def format_seed(seed):
    if isinstance(seed, (tuple, list)):
        return ":".join(str(int(s)) for s in seed)
    return str(int(seed))


def parse_seed(text):
    parts = [int(p) for p in str(text).split(":")]
    return parts[0] if len(parts) == 1 else tuple(parts)
