"""Command line front end.

    orthocipher keygen  --dim 4 --seed 7 --mode structured --out pub.key,priv.key
    orthocipher encrypt --key pub.key,priv.key --in msg.txt --out ct.json [--perm 3,0,1,2]
    orthocipher decrypt --key pub.key,priv.key --in ct.json [--out msg.txt]
    orthocipher attack  --in ct.json [--coeff-bound 1] [--tol 1e-4] [--out report.json]
    orthocipher table   --codec exp --out table.csv
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, attack, ctfile, encoding, errors, keys
from .cipher import CipherParams, WeakBlockWarning, decrypt_message, encrypt_message
from .linalg import Permutation

log = logging.getLogger('orthocipher')

# exit code per error class; the first matching entry wins
EXIT_CODES: list[tuple[type[BaseException], int]] = [
    (OSError, 3),
    (errors.UnknownSymbol, 4),
    (errors.InvalidCode, 5),
    (errors.MalformedKeyFile, 6),
    (errors.OrthogonalityViolation, 7),
    (errors.MalformedCiphertext, 8),
    (errors.DegenerateBlock, 9),
    (errors.DecodeFailure, 10),
    (errors.AmbiguousDecode, 11),
    (errors.CombinationSpaceTooLarge, 12),
    (errors.DimensionMismatch, 13),
    (errors.InvalidDimension, 13),
    (ValueError, 14),
]


class UsageError(Exception):
    pass


def _pair_paths(value: str) -> tuple[str, str]:
    parts = [p for p in value.split(',')]
    if len(parts) != 2 or not all(parts):
        raise UsageError(f'expected two comma-separated paths, got {value!r}')
    return parts[0], parts[1]


def _permutation(value: Optional[str], dim: int) -> Optional[Permutation]:
    if value is None:
        return None
    try:
        perm = Permutation(int(v) for v in value.split(','))
    except ValueError:
        raise UsageError(f'--perm must list a permutation of 0..{dim - 1}, got {value!r}')
    if perm.dim != dim:
        raise UsageError(f'--perm has {perm.dim} entries but the key dimension is {dim}')
    return perm


def _load_pair(value: str) -> keys.KeyPair:
    pub, priv = _pair_paths(value)
    return keys.KeyPair(keys.read_key(pub), keys.read_key(priv))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def cmd_keygen(args) -> None:
    pub_path, priv_path = _pair_paths(args.out)
    pair = keys.generate_keypair(args.dim, args.seed, args.mode)
    keys.write_key(pair.public, pub_path)
    keys.write_key(pair.private, priv_path)
    log.info('wrote %s and %s (order of C: %s)', pub_path, priv_path, pair.combined().order)


def cmd_encrypt(args) -> None:
    pair = _load_pair(args.key)
    text = Path(args.input).read_text(encoding='utf-8').rstrip('\r\n')
    params = CipherParams(pair.dim, args.codec, _permutation(args.perm, pair.dim),
                          strict_degenerate=not args.permissive)
    ct = encrypt_message(text, pair, params)
    _emit(ctfile.ciphertext_to_json(ct, include_permutation=not args.omit_perm), args.out)


def cmd_decrypt(args) -> None:
    pair = _load_pair(args.key)
    ct = ctfile.read_ciphertext(args.input)
    perm = _permutation(args.perm, pair.dim) or ct.permutation
    if ct.permuted and perm is None:
        raise UsageError('ciphertext is permuted; pass --perm')
    if perm is not None and not ct.permuted:
        raise UsageError('ciphertext is not permuted but --perm was given')
    params = CipherParams(pair.dim, ct.codec, perm, verify_rel_tol=args.verify_tol,
                          zero_tol=args.zero_tol)
    _emit(decrypt_message(ct, pair, params) + '\n', args.out)


def cmd_attack(args) -> None:
    ct = ctfile.read_ciphertext(args.input)
    table = encoding.build_table(ct.codec)
    reports = attack.attack_report(ct, table, args.coeff_bound, args.tol)
    doc = attack.report_to_dict(reports, args.coeff_bound, args.tol, table)
    _emit(json.dumps(doc, indent=1) + '\n', args.out)
    resolved = sum(r.resolved for r in reports)
    log.info('%d of %d blocks resolved', resolved, len(reports))


def cmd_table(args) -> None:
    table = encoding.build_table(args.codec, args.f_max, args.c_max)
    _emit(table.to_csv(), args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog='orthocipher',
                                description='Orthogonal-matrix block cipher toolkit.')
    p.add_argument('--version', action='version', version=__version__)
    p.add_argument('-v', '--verbose', action='store_true', help='log progress to stderr')
    # also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true', default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest='command', required=True)

    k = sub.add_parser('keygen', parents=[common], help='generate a public/private key pair')
    k.add_argument('--dim', type=int, required=True)
    k.add_argument('--seed', type=int, required=True)
    k.add_argument('--mode', choices=[keys.STRUCTURED, keys.GENERAL], default=keys.STRUCTURED)
    k.add_argument('--out', required=True, metavar='PUB,PRIV')
    k.set_defaults(func=cmd_keygen)

    codecs = [c.value for c in encoding.Codec]
    e = sub.add_parser('encrypt', parents=[common], help='encrypt a text file')
    e.add_argument('--key', required=True, metavar='PUB,PRIV')
    e.add_argument('--in', dest='input', required=True)
    e.add_argument('--out')
    e.add_argument('--perm', help='permutation image, e.g. 3,0,1,2')
    e.add_argument('--codec', choices=codecs, default='exp')
    e.add_argument('--permissive', action='store_true',
                   help='encrypt degenerate blocks instead of refusing')
    e.add_argument('--omit-perm', action='store_true',
                   help='do not record the permutation in the ciphertext file')
    e.set_defaults(func=cmd_encrypt)

    d = sub.add_parser('decrypt', parents=[common], help='decrypt a ciphertext file')
    d.add_argument('--key', required=True, metavar='PUB,PRIV')
    d.add_argument('--in', dest='input', required=True)
    d.add_argument('--out')
    d.add_argument('--perm', help='permutation image when the file does not carry it')
    d.add_argument('--verify-tol', type=float, default=1e-6)
    d.add_argument('--zero-tol', type=float, default=1e-9)
    d.set_defaults(func=cmd_decrypt)

    a = sub.add_parser('attack', parents=[common], help='ciphertext-only combination attack')
    a.add_argument('--in', dest='input', required=True)
    a.add_argument('--coeff-bound', type=int, default=1)
    a.add_argument('--tol', type=float, default=attack.DEFAULT_ATTACK_TOL)
    a.add_argument('--out')
    a.set_defaults(func=cmd_attack)

    t = sub.add_parser('table', parents=[common], help='export the coefficient/exponent table as CSV')
    t.add_argument('--codec', choices=codecs, default='exp')
    t.add_argument('--f-max', type=int, default=64)
    t.add_argument('--c-max', type=int, default=65)
    t.add_argument('--out')
    t.set_defaults(func=cmd_table)
    return p


def _exit_code(exc: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 1


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(name)s: %(message)s')
    try:
        with warnings.catch_warnings():
            warnings.simplefilter('always', WeakBlockWarning)
            warnings.showwarning = _log_warning
            args.func(args)
    except UsageError as e:
        print(f'orthocipher {args.command}: {e}', file=sys.stderr)
        return 2
    except (errors.OrthoCipherError, OSError, ValueError) as e:
        print(f'orthocipher {args.command}: {type(e).__name__}: {e}', file=sys.stderr)
        return _exit_code(e)
    return 0


def _log_warning(message, category, filename, lineno, file=None, line=None):
    log.warning('%s', message)


def main() -> None:
    sys.exit(run())


if __name__ == '__main__':
    main()
