"""Ciphertext file format.

JSON object::

    {"version": 1, "dim": 4, "codec": "exp", "permuted": true,
     "perm_image": [3, 0, 1, 2], "pad_count": 0,
     "blocks": [["689429525.33366895", ...], ...]}

``perm_image`` is optional even when ``permuted`` is true; the receiver then
has to supply the permutation. Block entries are 17-significant-digit
decimal strings so every double survives the round trip exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .cipher import CiphertextMessage
from .encoding import Codec
from .errors import MalformedCiphertext
from .linalg import Permutation

CT_VERSION = 1


def ciphertext_to_json(ct: CiphertextMessage, include_permutation: bool = True) -> str:
    doc = {
        'version': CT_VERSION,
        'dim': ct.dim,
        'codec': ct.codec.value,
        'permuted': ct.permuted,
    }
    if ct.permutation is not None and include_permutation:
        doc['perm_image'] = list(ct.permutation.image)
    doc['pad_count'] = ct.pad_count
    doc['blocks'] = [['%.17g' % v for v in b] for b in ct.blocks]
    return json.dumps(doc, indent=1) + '\n'


def _int(doc: dict, name: str) -> int:
    v = doc.get(name)
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedCiphertext(f'{name} must be an integer, got {v!r}')
    return v


def ciphertext_from_json(text: str) -> CiphertextMessage:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedCiphertext(f'not valid JSON: {e}') from None
    if not isinstance(doc, dict):
        raise MalformedCiphertext('ciphertext file must hold a JSON object')
    if doc.get('version') != CT_VERSION:
        raise MalformedCiphertext(f'unsupported ciphertext version {doc.get("version")!r}')
    dim, pad = _int(doc, 'dim'), _int(doc, 'pad_count')
    permuted = doc.get('permuted')
    if not isinstance(permuted, bool):
        raise MalformedCiphertext('permuted must be a boolean')
    try:
        codec = Codec.parse(doc.get('codec'))
    except ValueError as e:
        raise MalformedCiphertext(str(e)) from None
    perm = None
    if 'perm_image' in doc:
        if not permuted:
            raise MalformedCiphertext('perm_image given but permuted is false')
        image = doc['perm_image']
        if not isinstance(image, list) or not all(
                isinstance(i, int) and not isinstance(i, bool) for i in image):
            raise MalformedCiphertext('perm_image must be a list of integers')
        try:
            perm = Permutation(image)
        except ValueError as e:
            raise MalformedCiphertext(str(e)) from None
    blocks = doc.get('blocks')
    if not isinstance(blocks, list) or not all(
            isinstance(b, list) and all(isinstance(v, str) for v in b) for b in blocks):
        raise MalformedCiphertext('blocks must be a list of lists of decimal strings')
    try:
        values = [[float(v) for v in b] for b in blocks]
        return CiphertextMessage(dim, codec, pad, tuple(values), perm, permuted)
    except ValueError as e:
        raise MalformedCiphertext(str(e)) from None


def write_ciphertext(ct: CiphertextMessage, path, include_permutation: bool = True) -> None:
    Path(path).write_text(ciphertext_to_json(ct, include_permutation), encoding='utf-8')


def read_ciphertext(path) -> CiphertextMessage:
    return ciphertext_from_json(Path(path).read_text(encoding='utf-8'))
