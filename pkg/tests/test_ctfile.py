import json

import numpy as np
import pytest

from orthocipher import cipher, ctfile, keys
from orthocipher.cipher import CipherParams
from orthocipher.errors import MalformedCiphertext

from conftest import EXAMPLE_C, EXAMPLE_P


@pytest.fixture
def ct():
    return cipher.encrypt_message('CRYPTOGRAPHY', EXAMPLE_C, CipherParams(4, permutation=EXAMPLE_P))


def test_round_trip_bit_exact(ct):
    back = ctfile.ciphertext_from_json(ctfile.ciphertext_to_json(ct))
    assert back.dim == 4 and back.pad_count == 0 and back.permutation == EXAMPLE_P
    for a, b in zip(ct.blocks, back.blocks):
        assert np.array_equal(np.asarray(a), np.asarray(b))


def test_random_doubles_bit_exact():
    rng = np.random.default_rng(5)
    for _ in range(20):
        key = keys.generate_keypair(3, int(rng.integers(1 << 30)), 'general')
        try:
            c = cipher.encrypt_message('abcXYZ 09', key, CipherParams(3, 'sinh'))
        except cipher.DegenerateBlock:
            continue
        back = ctfile.ciphertext_from_json(ctfile.ciphertext_to_json(c))
        assert all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(c.blocks, back.blocks))
        assert back.codec.value == 'sinh'


def test_omit_permutation(ct):
    doc = json.loads(ctfile.ciphertext_to_json(ct, include_permutation=False))
    assert doc['permuted'] is True and 'perm_image' not in doc
    back = ctfile.ciphertext_from_json(json.dumps(doc))
    assert back.permuted and back.permutation is None


def test_file_io(tmp_path, ct):
    path = tmp_path / 'ct.json'
    ctfile.write_ciphertext(ct, path)
    back = ctfile.read_ciphertext(path)
    assert all(np.array_equal(a, b) for a, b in zip(back.blocks, ct.blocks))


@pytest.mark.parametrize('mutate', [
    lambda d: d.update(version=2),
    lambda d: d.update(dim='4'),
    lambda d: d.update(codec='tanh'),
    lambda d: d.update(permuted='yes'),
    lambda d: d.update(perm_image=[0, 0, 1, 2]),
    lambda d: d.update(perm_image=[1, 0]),
    lambda d: d.update(blocks=[[1.0, 2.0, 3.0, 4.0]]),
    lambda d: d.update(blocks=[['1', '2', 'x', '4']]),
    lambda d: d.update(blocks=[['1', '2', '3']]),
    lambda d: d.update(pad_count=4),
    lambda d: d.pop('blocks'),
])
def test_malformed(ct, mutate):
    doc = json.loads(ctfile.ciphertext_to_json(ct))
    mutate(doc)
    with pytest.raises(MalformedCiphertext):
        ctfile.ciphertext_from_json(json.dumps(doc))


@pytest.mark.parametrize('text', ['', 'not json', '[1, 2]'])
def test_not_a_document(text):
    with pytest.raises(MalformedCiphertext):
        ctfile.ciphertext_from_json(text)


def test_perm_image_without_permuted_flag(ct):
    doc = json.loads(ctfile.ciphertext_to_json(ct))
    doc['permuted'] = False
    with pytest.raises(MalformedCiphertext):
        ctfile.ciphertext_from_json(json.dumps(doc))
