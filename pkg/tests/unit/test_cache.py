"""Test the on-disk slice cache and atomic writes."""

import hashlib
import os
from pathlib import Path

import pytest

from graphcx.complexes.differentials import differential
from graphcx.complexes.generation import generate_basis
from graphcx.core.errors import MalformedGraphError
from graphcx.core.graph import FamilyTag
from graphcx.core.types import FamilyKind
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.ribbon.complex import ribbon_slice
from graphcx.storage.cache import SliceCache, basis_text, write_atomic
from graphcx.utils.hashing import generate_file_digest

pytestmark = pytest.mark.unit

ORIENTED_1 = FamilyTag(FamilyKind.ORIENTED, 1)


@pytest.fixture
def cache(temp_cache_dir):
    return SliceCache(temp_cache_dir)


class TestWriteAtomic:
    """Temporary file plus rename, retried on OS errors."""

    def test_writes_and_creates_parents(self, temp_cache_dir):
        path = Path(temp_cache_dir) / "a" / "b" / "out.txt"
        write_atomic(path, "hello\n")
        assert path.read_text() == "hello\n"

    def test_retries_transient_failure(self, temp_cache_dir, mocker):
        real_replace = os.replace
        calls = []

        def flaky_replace(src, dst):
            calls.append(src)
            if len(calls) == 1:
                raise OSError("device busy")
            return real_replace(src, dst)

        mocker.patch("graphcx.storage.cache.os.replace", side_effect=flaky_replace)
        path = Path(temp_cache_dir) / "out.txt"
        write_atomic(path, "data")

        assert len(calls) == 2
        assert path.read_text() == "data"
        assert list(Path(temp_cache_dir).glob(".*.tmp")) == []

    def test_gives_up_after_repeated_failures(self, temp_cache_dir, mocker):
        mocker.patch("graphcx.storage.cache.os.replace", side_effect=OSError("read-only"))
        with pytest.raises(OSError):
            write_atomic(Path(temp_cache_dir) / "out.txt", "data")
        assert list(Path(temp_cache_dir).iterdir()) == []


class TestSliceCache:
    """Bases and matrices on disk."""

    def test_layout(self, cache, temp_cache_dir):
        path = cache.slice_path(ORIENTED_1, 2, 2, "basis.jsonl")
        assert path == Path(temp_cache_dir) / "oriented" / "1" / "2_2_any.basis.jsonl"
        hairy = FamilyTag(FamilyKind.HAIRY, 2, 3)
        assert cache.slice_path(hairy, 1, 0, "d.mat").name == "1_0_3.d.mat"

    def test_basis_round_trip(self, cache):
        sl = generate_basis(ORIENTED_1, 3, 4)
        path = cache.save_basis(sl)
        assert path.read_text() == basis_text(sl)
        loaded = cache.load_basis(ORIENTED_1, 3, 4)
        assert loaded.basis == sl.basis

    def test_missing_file(self, cache):
        assert cache.load_basis(ORIENTED_1, 2, 2) is None
        assert cache.load_matrix(ORIENTED_1, 2, 2, "d") is None
        assert cache.load_ribbon_basis(1, 2, 1) is None

    def test_basis_hit_skips_generation(self, cache, mocker):
        first = cache.basis(ORIENTED_1, 2, 2)
        spy = mocker.patch("graphcx.storage.cache.generate_basis")
        second = cache.basis(ORIENTED_1, 2, 2)
        spy.assert_not_called()
        assert second.basis == first.basis

    def test_size_mismatch(self, cache):
        path = cache.save_basis(generate_basis(ORIENTED_1, 2, 2))
        path.write_text(path.read_text().splitlines()[0] + "\n")
        with pytest.raises(MalformedGraphError):
            cache.load_basis(ORIENTED_1, 2, 2)

    def test_empty_file(self, cache):
        path = cache.slice_path(ORIENTED_1, 2, 2, "basis.jsonl")
        path.parent.mkdir(parents=True)
        path.write_text("")
        with pytest.raises(MalformedGraphError):
            cache.load_basis(ORIENTED_1, 2, 2)

    def test_matrix_round_trip(self, cache):
        m = SparseRationalMatrix.from_dense([[1, 0], [0, -2]])
        cache.save_matrix(ORIENTED_1, 3, 4, "d", m)
        assert cache.load_matrix(ORIENTED_1, 3, 4, "d") == m

    def test_ribbon_round_trip(self, cache):
        sl = ribbon_slice(1, 2, 1)
        cache.save_ribbon_basis(sl)
        assert cache.load_ribbon_basis(1, 2, 1).basis == sl.basis


    def test_differential_miss_builds_and_stores(self, cache):
        src = cache.basis(ORIENTED_1, 3, 4)
        matrix, dst = cache.differential("d", src)

        expected, expected_dst = differential("d", src)
        assert matrix == expected
        assert dst.basis == expected_dst.basis
        assert cache.load_matrix(ORIENTED_1, 3, 4, "d") == matrix
        assert cache.load_basis(ORIENTED_1, 2, 3) is not None

    def test_differential_hit_skips_the_build(self, cache, mocker):
        src = cache.basis(ORIENTED_1, 3, 4)
        built, _ = cache.differential("d", src)
        rebuild = mocker.patch("graphcx.storage.cache.operator_matrix")

        matrix, _ = cache.differential("d", src)
        assert matrix == built
        rebuild.assert_not_called()

    def test_stale_differential_is_rebuilt(self, cache):
        src = cache.basis(ORIENTED_1, 3, 4)
        built, dst = cache.differential("d", src)
        cache.save_matrix(ORIENTED_1, 3, 4, "d", SparseRationalMatrix.zeros(len(dst) + 1, len(src)))

        matrix, _ = cache.differential("d", src)
        assert matrix == built
        assert cache.load_matrix(ORIENTED_1, 3, 4, "d") == built

    def test_ribbon_basis_is_stored_once(self, cache, mocker):
        first = cache.ribbon_basis(1, 2, 1)
        assert cache.ribbon_path(1, 2, 1, "basis.jsonl").exists()
        mocker.patch("graphcx.storage.cache.ribbon_slice", side_effect=AssertionError("rebuilt"))
        assert cache.ribbon_basis(1, 2, 1).basis == first.basis

class TestDigest:
    def test_sha256(self, temp_cache_dir):
        path = Path(temp_cache_dir) / "blob"
        path.write_bytes(b"graph complexes")
        assert generate_file_digest(path) == hashlib.sha256(b"graph complexes").hexdigest()
