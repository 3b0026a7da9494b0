import io
import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from klnorm.errors import EmptyHistogramError, InputFormatError, InvalidDistributionError
from klnorm.models import DistSpec
from klnorm.schemas import Family
from klnorm.services.gen import (
    byte_histogram,
    generate,
    random_small_instance,
    read_counts,
    read_counts_file,
    sweep_specs,
    write_counts,
)

GOLDEN = Path(__file__).parent / "golden"


def test_uniform_residue_goes_to_first_symbol():
    assert generate(DistSpec(family=Family.uniform, r=4, N=10)).counts == [4, 2, 2, 2]
    assert generate(DistSpec(family=Family.uniform, r=5, N=5)).counts == [1] * 5


def test_sparse_heavy_golden():
    case = json.loads((GOLDEN / "sparse_heavy_r8_N1000.json").read_text())
    h = generate(DistSpec(family=case["family"], r=case["r"], N=case["N"]))
    assert h.counts == case["counts"]


@pytest.mark.parametrize("r, N", [(1, 1), (7, 7), (64, 1000), (256, 10**6), (1024, 10**9)])
def test_every_family_conserves_mass_and_support(r, N):
    for spec in sweep_specs(r, N):
        h = generate(spec)
        assert h.total == N
        assert h.support_size == r


@pytest.mark.parametrize("spec", [
    DistSpec(family=Family.geometric, r=64, N=10**6, p=0.7),
    DistSpec(family=Family.geometric, r=300, N=10**6, p=0.95),
    DistSpec(family=Family.zipf, r=500, N=10**6, s=1.0),
    DistSpec(family=Family.zipf, r=64, N=10**4, s=1.5),
], ids=lambda s: s.label)
def test_monotone_families(spec):
    counts = generate(spec).counts
    assert all(a >= b for a, b in zip(counts[1:], counts[2:]))
    assert counts[0] >= counts[1]


def test_gaussian_is_symmetric_away_from_first_symbol():
    counts = generate(DistSpec(family=Family.gaussian, r=65, N=10**6)).counts
    assert counts[1:32] == counts[63:32:-1]


def test_sweep_labels():
    assert [s.label for s in sweep_specs(64, 1000)] == [
        "uniform", "geom0.7", "geom0.95", "zipf1.0", "zipf1.5", "gaussian", "sparse",
    ]


def test_too_few_counts_for_support():
    with pytest.raises(InvalidDistributionError):
        generate(DistSpec(family=Family.geometric, r=64, N=63, p=0.7))


@pytest.mark.parametrize("kwargs", [
    {"family": Family.geometric, "p": 1.5},
    {"family": Family.geometric},
    {"family": Family.zipf, "s": 0.0},
])
def test_bad_family_parameters(kwargs):
    with pytest.raises(ValidationError):
        DistSpec(r=4, N=10, **kwargs)


def test_byte_histogram():
    h = byte_histogram(b"aab")
    assert h.counts[ord("a")] == 2
    assert h.counts[ord("b")] == 1
    assert h.total == 3
    assert len(h.counts) == 256


def test_byte_histogram_all_values_from_stream():
    h = byte_histogram(io.BytesIO(bytes(range(256)) * 3), chunk_size=100)
    assert h.counts == [3] * 256
    assert h.support_size == 256


def test_byte_histogram_empty():
    with pytest.raises(EmptyHistogramError, match="empty histogram"):
        byte_histogram(b"")


def test_random_small_instance_is_deterministic():
    assert random_small_instance(42) == random_small_instance(42)
    for seed in range(500):
        h, M = random_small_instance(seed)
        assert 1 <= h.support_size <= 6
        assert h.support_size <= M <= 24
        assert max(h.counts) <= 50


def test_random_small_instance_accepts_any_64_bit_seed():
    h, M = random_small_instance(-1)
    assert M >= h.support_size


def test_read_counts_accepts_zero_slots():
    h = read_counts("3 0\n2\t0 ")
    assert h.counts == [3, 0, 2, 0]
    assert h.support == [0, 2]


@pytest.mark.parametrize("text", ["", "1 2 x", "1.5 2", "3 -1"])
def test_read_counts_rejects_malformed_input(text):
    with pytest.raises(InputFormatError):
        read_counts(text)


def test_counts_file_round_trip(tmp_path):
    h = generate(DistSpec(family=Family.zipf, r=32, N=5000, s=1.0))
    path = tmp_path / "counts.txt"
    write_counts(h.counts, path)
    assert read_counts_file(path) == h
