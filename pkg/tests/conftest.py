import numpy as np
import pytest

from htcarnot import catalog_names, catalog_structure, generator


@pytest.fixture(scope="session")
def heis():
    return catalog_structure("heisenberg3")


@pytest.fixture(scope="session")
def quat():
    return catalog_structure("htype4x3")


@pytest.fixture(scope="session")
def contact():
    return catalog_structure("contact12")


@pytest.fixture(scope="session")
def degenerate():
    return catalog_structure("degenerate-corank1")


@pytest.fixture(scope="session", params=catalog_names())
def group(request):
    """Parametrized over the whole catalog."""
    return catalog_structure(request.param)


def seeded_covectors(sc, count, stream, vmax_frac=0.95, su_min=0.1):
    """Deterministic covectors inside the injectivity domain.

    u components uniform in [-1.5, 1.5] resampled until |S u| >= su_min,
    |v| uniform in (0, vmax_frac * 2 pi / alpha_max].
    """
    rng = generator(0xC4A07, stream=stream)
    out = []
    while len(out) < count:
        u = rng.uniform(-1.5, 1.5, size=sc.rank)
        if np.linalg.norm(sc.s_diag * u) < su_min:
            continue
        direction = rng.standard_normal(sc.corank)
        direction /= np.linalg.norm(direction)
        r = rng.uniform(0.05, vmax_frac) * sc.first_conjugate_radius
        out.append((u, r * direction))
    return out
