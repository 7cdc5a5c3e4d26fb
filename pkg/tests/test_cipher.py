import hashlib
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaoscell.analysis import histogram, shannon_entropy
from chaoscell.automata import evolve_mask, seed_mask_matrix, tile_mask
from chaoscell.chaos import ChaosParams, mod3_selector_stream
from chaoscell.cipher import (
    SEED_OFFSET,
    STAGES,
    MasterKey,
    decrypt,
    derive_schedule,
    encrypt,
    encrypt_traced,
    key_material,
    load_key_file,
    parse_key_text,
    parse_key_triplet,
)
from chaoscell.errors import DimensionError, DomainError, KeyFormatError
from chaoscell.permutation import argsort_keys, shuffle_image
from chaoscell.substitution import SBoxTriple, build_sbox, substitute_image

keys = st.builds(
    MasterKey.from_values,
    st.floats(0.05, 3.99),
    st.floats(1e-6, 1 - 1e-6),
    st.integers(1, 40),
)

FIXED_SEEDS = [
    0.7206155056623197,
    0.6041733889247873,
    0.7844796344652383,
    0.7311309181347028,
    0.8577340758431786,
    0.42172516070099153,
    0.14378689148733415,
]


def perturbed(key, dx):
    return MasterKey.from_values(key.params.r, key.params.x0 + dx, key.iterations)


class TestMasterKey:
    @pytest.mark.parametrize("iterations", [0, -1, 1.5])
    def test_iterations(self, iterations):
        with pytest.raises(DomainError):
            MasterKey(ChaosParams(3.9, 0.3), iterations)

    def test_text_round_trip(self, fixed_key):
        assert parse_key_text(fixed_key.to_text()) == fixed_key


class TestSchedule:
    def test_deterministic(self, fixed_key):
        assert derive_schedule(fixed_key) == derive_schedule(fixed_key)

    def test_fixed_key_pins(self, fixed_key):
        sched = derive_schedule(fixed_key)
        assert sched.seeds() == pytest.approx(FIXED_SEEDS, rel=1e-13)
        assert all(getattr(sched, s).r == fixed_key.params.r for s in STAGES)

    def test_independent_derivation(self, fixed_key):
        r, x = fixed_key.params.r, fixed_key.params.x0
        for _ in range(1000):
            x = (r * x * (1.0 - x) + (4.0 - r) * math.sin(math.pi * x) / 4.0) % 1.0
        expected = []
        for s in range(1, 8):
            x = (r * x * (1.0 - x) + (4.0 - r) * math.sin(math.pi * x) / 4.0) % 1.0
            expected.append((x + s * SEED_OFFSET) % 1.0)
        assert derive_schedule(fixed_key).seeds() == expected

    def test_nearby_keys_differ_everywhere(self, fixed_key):
        a = derive_schedule(fixed_key).seeds()
        b = derive_schedule(perturbed(fixed_key, 1e-12)).seeds()
        assert all(x != y for x, y in zip(a, b))

    def test_stage_streams_are_not_shifted_copies(self, fixed_key):
        sched = derive_schedule(fixed_key)
        draws = [sched.stream(s).take_reals(64) for s in STAGES]
        for i in range(len(draws)):
            for j in range(len(draws)):
                if i != j:
                    assert not np.isin(draws[i][:8], draws[j]).any()


class TestRoundTrip:
    @settings(max_examples=60, deadline=None)
    @given(keys, st.sampled_from([(16, 16), (16, 48), (64, 64), (32, 16)]), st.integers(0, 2**32 - 1))
    def test_random(self, key, shape, seed):
        img = np.random.default_rng(seed).integers(0, 256, shape, dtype=np.uint8)
        assert np.array_equal(decrypt(encrypt(img, key), key), img)

    def test_natural_image(self, natural_images, fixed_key):
        for img in natural_images.values():
            assert np.array_equal(decrypt(encrypt(img, fixed_key), fixed_key), img)


class TestEncrypt:
    def test_composition_matches_definition(self, rng, fixed_key):
        img = rng.integers(0, 256, (32, 48), dtype=np.uint8)
        sched = derive_schedule(fixed_key)
        rp = argsort_keys(sched.stream("row_perm").take_reals(32))
        cp = argsort_keys(sched.stream("col_perm").take_reals(48))
        triple = SBoxTriple(tuple(build_sbox(sched.stream(s)) for s in ("sbox1", "sbox2", "sbox3")))
        sel = mod3_selector_stream(sched.stream("selector"), 32 * 48)
        mask = tile_mask(evolve_mask(seed_mask_matrix(sched.stream("mask")), fixed_key.iterations), 32, 48)
        expected = substitute_image(shuffle_image(img, rp, cp), triple, sel) ^ mask
        assert np.array_equal(encrypt(img, fixed_key), expected)

    def test_stage_order_matters(self, rng, fixed_key):
        img = rng.integers(0, 256, (32, 32), dtype=np.uint8)
        km = key_material(fixed_key, 32, 32)
        reordered = shuffle_image(substitute_image(img ^ km.mask_tile, km.triple, km.selector), km.row_perm, km.col_perm)
        assert not np.array_equal(encrypt(img, fixed_key), reordered)

    def test_deterministic(self, rng, fixed_key):
        img = rng.integers(0, 256, (64, 64), dtype=np.uint8)
        assert np.array_equal(encrypt(img, fixed_key), encrypt(img, fixed_key))

    def test_constant_image_diffuses(self, fixed_key):
        ct = encrypt(np.full((64, 64), 128, dtype=np.uint8), fixed_key)
        assert shannon_entropy(ct) >= 7.9

    @pytest.mark.parametrize("shape", [(24, 16), (16, 24), (15, 15), (8, 8)])
    def test_size_rule(self, shape, fixed_key):
        with pytest.raises(DimensionError):
            encrypt(np.zeros(shape, np.uint8), fixed_key)
        with pytest.raises(DimensionError):
            decrypt(np.zeros(shape, np.uint8), fixed_key)

    def test_single_pixel_change_stays_local(self, rng, fixed_key):
        # no plaintext feedback: one changed plaintext pixel alters one ciphertext byte
        img = rng.integers(0, 256, (64, 64), dtype=np.uint8)
        other = img.copy()
        other[10, 20] ^= 1
        assert np.count_nonzero(encrypt(img, fixed_key) != encrypt(other, fixed_key)) == 1

    def test_determinism_across_processes(self, fixed_key):
        code = (
            "import hashlib,numpy as np;from chaoscell.cipher import *;"
            "img=np.arange(64*64,dtype=np.uint32).reshape(64,64).astype(np.uint8);"
            f"k=MasterKey.from_values({fixed_key.params.r!r},{fixed_key.params.x0!r},{fixed_key.iterations});"
            "print(hashlib.sha256(encrypt(img,k).tobytes()).hexdigest())"
        )
        out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout.strip()
        img = np.arange(64 * 64, dtype=np.uint32).reshape(64, 64).astype(np.uint8)
        assert out == hashlib.sha256(encrypt(img, fixed_key).tobytes()).hexdigest()


class TestTrace:
    def test_trace_is_observational(self, rng, fixed_key):
        img = rng.integers(0, 256, (48, 32), dtype=np.uint8)
        ct, trace = encrypt_traced(img, fixed_key)
        assert np.array_equal(ct, encrypt(img, fixed_key))
        assert np.array_equal(trace.ciphertext, ct)
        assert np.array_equal(trace.substituted ^ trace.mask, ct)

    def test_shuffled_histogram(self, natural_images, fixed_key):
        img = natural_images["cameraman"]
        _, trace = encrypt_traced(img, fixed_key)
        assert np.array_equal(histogram(trace.shuffled), histogram(img))

    def test_mask_period_16(self, rng, fixed_key):
        _, trace = encrypt_traced(rng.integers(0, 256, (64, 48), dtype=np.uint8), fixed_key)
        m = trace.mask
        assert np.array_equal(m[16:], m[:-16])
        assert np.array_equal(m[:, 16:], m[:, :-16])


class TestKeySensitivity:
    def test_ciphertext_avalanche_least_significant_bit(self, rng, fixed_key):
        img = rng.integers(0, 256, (256, 256), dtype=np.uint8)
        base = encrypt(img, fixed_key)
        fracs = []
        x0 = fixed_key.params.x0
        for t in range(20):
            x0 = float(np.nextafter(x0, 1.0))
            other = MasterKey.from_values(fixed_key.params.r, x0, fixed_key.iterations)
            fracs.append(np.mean(encrypt(img, other) != base))
        assert np.mean(fracs) >= 0.99

    def test_wrong_x0(self, natural_images, fixed_key):
        img = natural_images["cameraman"]
        ct = encrypt(img, fixed_key)
        assert np.mean(decrypt(ct, perturbed(fixed_key, 1e-12)) != img) >= 0.99

    def test_wrong_iterations(self, natural_images, fixed_key):
        img = natural_images["cameraman"]
        ct = encrypt(img, fixed_key)
        wrong = MasterKey(fixed_key.params, fixed_key.iterations + 1)
        assert np.mean(decrypt(ct, wrong) != img) >= 0.99


class TestKeyText:
    def test_golden_parse(self):
        key = parse_key_text("r=3.99 x0=0.123456789 I=1")
        assert key.params.r.hex() == "0x1.feb851eb851ecp+1"
        assert key.params.x0.hex() == "0x1.f9add3739635fp-4"
        assert key.iterations == 1

    def test_whitespace_and_order(self):
        assert parse_key_text("I=30\n x0=0.25\tr=3.5\n") == MasterKey.from_values(3.5, 0.25, 30)

    def test_exponent_form(self):
        assert parse_key_text("r=3.9e0 x0=1.5E-1 I=2").params == ChaosParams(3.9, 0.15)

    @pytest.mark.parametrize(
        "text",
        [
            "r=3.99 x0=0.1",
            "r=3.99 x0=0.1 I=1 I=2",
            "r=3.99 x0=0.1 I=1.5",
            "r=abc x0=0.1 I=1",
            "r=3.99 x0=0x1p-3 I=1",
            "r=3.99 x0=nan I=1",
            "r=3_9 x0=0.1 I=1",
            "r=3.99 y=0.1 I=1",
            "r = 3.99 x0=0.1 I=1",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(KeyFormatError):
            parse_key_text(text)

    @pytest.mark.parametrize("text", ["r=4 x0=0.1 I=1", "r=3.9 x0=0 I=1", "r=3.9 x0=0.5 I=0"])
    def test_out_of_domain(self, text):
        with pytest.raises(DomainError):
            parse_key_text(text)

    def test_triplet(self):
        assert parse_key_triplet("3.99,0.123456789,1") == parse_key_text("r=3.99 x0=0.123456789 I=1")
        assert parse_key_triplet("3.9, 0.2").iterations == 1
        with pytest.raises(KeyFormatError):
            parse_key_triplet("3.9;0.2;1")

    def test_key_file(self, tmp_path, fixed_key):
        path = tmp_path / "k.txt"
        path.write_text("r=3.99 x0=0.123456789 I=1\n")
        assert load_key_file(path) == fixed_key
