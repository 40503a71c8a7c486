import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orthocipher import encoding
from orthocipher.encoding import ALPHABET, Codec, build_table, lookup
from orthocipher.errors import InvalidCode, UnknownSymbol

from conftest import load_printed_table, printed_half_ulp, printed_value

EXP_TABLE = build_table(Codec.EXP)


def brute_lookup(table, v, rel_tol):
    return sorted((f, c) for f in range(1, table.f_max + 1) for c in range(1, table.c_max + 1)
                  if abs(v - table.value(f, c)) <= rel_tol * table.value(f, c))


def test_alphabet_layout():
    assert len(ALPHABET) == 63
    assert [ALPHABET.code(ch) for ch in 'AZaz 09'] == [1, 26, 27, 52, 53, 54, 63]


def test_encode_text():
    assert encoding.encode_text('CRYP') == (3, 18, 25, 16)
    assert encoding.encode_text('') == ()
    assert encoding.encode_text('A 9') == (1, 53, 63)


def test_encode_unknown_symbol():
    with pytest.raises(UnknownSymbol) as e:
        encoding.encode_text('AB!C')
    assert (e.value.position, e.value.character) == (2, '!')


def test_decode_codes():
    assert encoding.decode_codes((3, 18, 25, 16)) == 'CRYP'
    assert encoding.decode_codes([27]) == 'a'
    for bad in (0, 64, -3, 2.5):
        with pytest.raises(InvalidCode):
            encoding.decode_codes([1, bad])


@given(st.text(alphabet=''.join(ALPHABET.symbols)))
def test_alphabet_round_trip(s):
    assert encoding.decode_codes(encoding.encode_text(s)) == s


@given(st.lists(st.integers(1, 63)))
def test_code_round_trip(codes):
    assert encoding.encode_text(encoding.decode_codes(codes)) == tuple(codes)


def test_codec_forward():
    assert encoding.codec_forward('exp', 1) == pytest.approx(2.718281828459045, rel=1e-15)
    assert encoding.codec_forward('sinh', 0) == 0.0
    mpmath.mp.dps = 40
    ref = float((mpmath.e ** 25 - mpmath.e ** -25) / 2)
    assert encoding.codec_forward('sinh', 25) == pytest.approx(ref, rel=1e-15)
    assert encoding.codec_forward(Codec.COSH, 2) == pytest.approx(math.cosh(2))


@pytest.mark.parametrize('codec', list(Codec))
def test_codec_strictly_increasing_on_codes(codec):
    vals = codec.forward(np.arange(1, 66, dtype=float))
    assert np.all(np.diff(vals) > 0)


def test_unknown_codec():
    with pytest.raises(ValueError):
        Codec.parse('tanh')


def test_build_table_pinned_cells():
    assert EXP_TABLE.value(21, 18) == pytest.approx(1378859352, abs=1.0)
    assert round(EXP_TABLE.value(15, 3), 2) == 301.28
    assert EXP_TABLE.value(64, 65) == pytest.approx(1.08473e30, rel=5e-6)
    assert EXP_TABLE.values.shape == (64, 65)


@pytest.mark.parametrize('codec', list(Codec))
def test_table_strictly_increasing(codec):
    t = build_table(codec)
    assert np.all(np.diff(t.values, axis=0) > 0)
    assert np.all(np.diff(t.values, axis=1) > 0)
    assert np.all(np.isfinite(t.values))


def test_every_printed_cell_within_print_precision():
    cells = load_printed_table()
    assert len(cells) == 64 * 65
    for (f, c), s in cells.items():
        assert abs(EXP_TABLE.value(f, c) - printed_value(s)) <= printed_half_ulp(s) * (1 + 1e-9), \
            (f, c, s)


def test_random_printed_cells_relative():
    cells = load_printed_table()
    rng = random.Random(2024)
    # 2-decimal cells below 100 cannot carry 5e-5 relative precision
    pool = sorted(k for k, s in cells.items() if printed_value(s) >= 100)
    for f, c in rng.sample(pool, 30):
        assert EXP_TABLE.value(f, c) == pytest.approx(printed_value(cells[f, c]), rel=5e-5)


def test_lookup_examples():
    assert [(x.f, x.c) for x in lookup(EXP_TABLE, 1378859352, 1e-6)] == [(21, 18)]
    assert brute_lookup(EXP_TABLE, 1378859352, 1e-6) == [(21, 18)]
    amb = lookup(EXP_TABLE, 20850, 1e-3)
    assert sorted((x.f, x.c) for x in amb) == [(7, 8), (19, 7)]
    assert brute_lookup(EXP_TABLE, 20850, 1e-3) == [(7, 8), (19, 7)]
    assert amb[0].relative_error <= amb[1].relative_error
    assert lookup(EXP_TABLE, 1.0, 1e-6) == []


def test_lookup_rejects_bad_arguments():
    with pytest.raises(ValueError):
        lookup(EXP_TABLE, 0.0)
    with pytest.raises(ValueError):
        lookup(EXP_TABLE, 5.0, 0.0)


def test_lookup_complete_on_grid():
    for codec in (Codec.EXP, Codec.SINH):
        t = build_table(codec)
        for f in range(1, t.f_max + 1):
            for c in range(1, t.c_max + 1):
                hits = lookup(t, t.value(f, c), 1e-9)
                assert (f, c) in [(h.f, h.c) for h in hits]


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0, 1e31), st.sampled_from([1e-9, 1e-6, 1e-3, 0.05, 0.6]))
def test_lookup_sound_and_matches_brute_force(v, tol):
    hits = lookup(EXP_TABLE, v, tol)
    for h in hits:
        cell = EXP_TABLE.value(h.f, h.c)
        assert abs(v - cell) <= tol * cell
        assert h.relative_error <= tol
    assert sorted((h.f, h.c) for h in hits) == brute_lookup(EXP_TABLE, v, tol)


def test_table_csv():
    t = build_table('exp', 3, 4)
    rows = [r.split(',') for r in t.to_csv().splitlines()]
    assert rows[0] == ['f*exp(c)', '1', '2', '3', '4']
    assert [r[0] for r in rows[1:]] == ['1', '2', '3']
    assert float(rows[2][3]) == t.value(2, 3)
    assert rows[1][1] == '%.17g' % math.e
