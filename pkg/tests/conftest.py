import numpy as np
import pytest

from bitextfilter.embeddings import EmbeddingSet, normalize_rows


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_embedding_set(rng, n, dim, side="src", origin="noisy"):
    return EmbeddingSet(
        normalize_rows(rng.standard_normal((n, dim))), side=side, origin=origin
    )


def write_text(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return str(path)
