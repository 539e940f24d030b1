"""Command-line front end: DSL parsing, experiments and certificates.

Usage: python3 cli.py <command> [flags]; see `python3 cli.py --help`.
Every command prints one JSON object (keys sorted) to stdout or --output and
echoes the seed it ran with. Exit codes: 0 success, 1 negative result,
2 bad input.
"""
import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass
from errors import (SpindleError, DSLSyntaxError, MissingImage,
                    UnknownGenerator, VerificationFailed, InputError, SchemaMismatch)
from free_group import Word, Endo, abelianization, format_word, ALPHABET
from hnn import HnnWord, T, normal_form, format_hnn_word
from local_ring import make_ring, find_modulus, DEFAULT_MODULI
from mat_group import MatTuple, matrix, matrix_to_json, freeness_check
from dynamics import DEFAULT_CAP, period_tower, search_periodic
from lifting import DEFAULT_ORDER_CAP, DEFAULT_PRECISION, stable_exponent, verify_recurrence
from stallings import endo_rank
from wreath import Certificate, separate, verify

LOGGER = logging.getLogger(__name__)

DEFAULT_SEED = 0
DEFAULT_ENDO = "a->ab, b->ba"
DEFAULT_MATRICES = "[[[5,2],[2,1]], [[1,2],[2,5]]]"

# One token: a generator letter with an optional integer power.
TOKEN = re.compile(r"([a-z])(?:\^(-?\d+))?")

def _tokens(text):
    """[(symbol, power)] for a word in the DSL; whitespace is ignored."""
    text = re.sub(r"\s+", "", text)
    tokens, position = [], 0
    while position < len(text):
        match = TOKEN.match(text, position)
        if match is None:
            raise DSLSyntaxError(f"Unexpected {text[position:]!r} in {text!r}.")
        power = int(match.group(2)) if match.group(2) else 1
        tokens.append((match.group(1), power))
        position = match.end()
    return tokens

def _letters(tokens, index_of):
    letters = []
    for symbol, power in tokens:
        if symbol not in index_of:
            raise UnknownGenerator(f"Unknown generator {symbol!r}.")
        sign = 1 if power > 0 else -1
        letters.extend([(index_of[symbol], sign)] * abs(power))
    return tuple(letters)

def parse_endo(text):
    """Parses "a->ab, b->ba"; generators are ordered as their rules appear."""
    rules = [rule.strip() for rule in text.split(",")]
    if not text.strip() or any(not rule for rule in rules):
        raise DSLSyntaxError(f"Empty rule in {text!r}.")
    names, bodies = [], []
    for rule in rules:
        if "->" not in rule:
            raise MissingImage(f"Rule {rule!r} has no image.")
        name, body = (part.strip() for part in rule.split("->", 1))
        if len(name) != 1 or name not in ALPHABET:
            raise DSLSyntaxError(f"Bad generator name {name!r}.")
        if name in names:
            raise DSLSyntaxError(f"Generator {name!r} has two images.")
        names.append(name)
        bodies.append(body)
    index_of = dict({name: i for i, name in enumerate(names, start=1)})
    rank = len(names)
    images = tuple(Word(_letters(_tokens(body), index_of), rank) for body in bodies)
    return Endo(rank, images, tuple(names))

def parse_word(text, endo):
    """A Word over @endo's generators, e.g. "ab^-1a"."""
    index_of = dict({name: i for i, name in enumerate(endo.names, start=1)})
    return Word(_letters(_tokens(text), index_of), endo.rank)

def parse_hnn_word(text, endo):
    """An HnnWord such as "t a t^-1 b" or "t^6"."""
    index_of = dict({name: i for i, name in enumerate(endo.names, start=1)})
    index_of["t"] = T
    return HnnWord(_letters(_tokens(text), index_of), endo)

def parse_matrices(text):
    """An exact MatTuple from JSON [[[a, b], [c, d]], ...]."""
    try:
        rows_list = json.loads(text)
        return MatTuple(tuple(matrix(rows) for rows in rows_list))
    except (ValueError, TypeError) as error:
        raise DSLSyntaxError(f"Bad matrix list {text!r}: {error}") from error

@dataclass(frozen=True)
class RunConfig:
    """Everything a command depends on."""
    command: str
    endo: str = DEFAULT_ENDO
    matrices: str = DEFAULT_MATRICES
    p: int = 5
    tau: int = 1
    K: int = 4
    M: int = None
    word: str = ""
    length: int = 10
    strategy: str = "exhaustive"
    nonsingular_only: bool = False
    search_modulus: bool = False
    cap: int = DEFAULT_CAP
    order_cap: int = DEFAULT_ORDER_CAP
    budget: int = 10**6
    seed: int = DEFAULT_SEED
    workers: int = 1
    certificate: str = None
    output: str = None

    def modulus(self):
        """The GR modulus: default table, else searched when allowed."""
        if self.tau == 1 or (self.p, self.tau) in DEFAULT_MODULI:
            return None
        if not self.search_modulus:
            return None
        return find_modulus(self.p, self.tau)

def emit_certificate(certificate, path=None):
    """Serializes @certificate (keys sorted); writes it to @path if given."""
    text = json.dumps(certificate.to_json(), sort_keys=True, indent=2)
    if path is not None:
        with open(path, "w") as handle:
            handle.write(text + "\n")
    return text

def verify_certificate(source):
    """Re-verifies a certificate given as a path, a JSON string or a dict."""
    if isinstance(source, dict):
        obj = source
    else:
        text = source
        if not source.lstrip().startswith("{"):
            try:
                with open(source) as handle:
                    text = handle.read()
            except OSError as error:
                raise InputError(f"Cannot read certificate {source}: {error}") from error
        try:
            obj = json.loads(text)
        except ValueError as error:
            raise SchemaMismatch(f"Certificate is not JSON: {error}") from error
    certificate = Certificate.from_json(obj)
    phi = parse_endo(certificate.endo)
    word = parse_hnn_word(certificate.element, phi)
    return verify(certificate, phi, word)

def _periods(config):
    phi = parse_endo(config.endo)
    tower = period_tower(phi, parse_matrices(config.matrices), config.p, config.K,
                         config.cap, config.tau, config.modulus())
    payload = tower.to_json()
    payload.update(dict({"tails": list(tower.tails),
                         "prime_to_p": list(tower.prime_to_p_parts()),
                         "p_exponents": list(tower.p_exponents())}))
    return payload, 0

def _lift_verify(config):
    phi = parse_endo(config.endo)
    point = parse_matrices(config.matrices)
    M = config.M
    if M is None:
        M = stable_exponent(phi, point, config.p, config.tau,
                            order_cap=config.order_cap, cap=config.cap)
    report = verify_recurrence(phi, point, M, config.p, config.K, config.tau)
    payload = dict({"p": config.p, "M": M, "K": config.K,
                    "per_k": [level.to_json() for level in report]})
    return payload, 0 if all(level.passed for level in report) else 1

def _separate(config):
    phi = parse_endo(config.endo)
    word = parse_hnn_word(config.word, phi)
    certificate = separate(word, [(config.p, config.tau, config.K)],
                           parse_matrices(config.matrices), config.seed,
                           config.workers)
    if certificate is None:
        return dict({"element": format_hnn_word(word), "certificate": None}), 1
    if config.certificate is not None:
        emit_certificate(certificate, config.certificate)
    return dict({"element": format_hnn_word(word),
                 "certificate": certificate.to_json()}), 0

def _normal_form(config):
    phi = parse_endo(config.endo)
    nf = normal_form(parse_hnn_word(config.word, phi))
    return dict({"m": nf.m, "u": format_word(nf.u, phi.names), "n": nf.n,
                 "identity": nf.is_identity()}), 0

def _injective(config):
    rank, injective = endo_rank(parse_endo(config.endo))
    return dict({"rank": rank, "injective": injective}), 0 if injective else 1

def _abelianization(config):
    mat, in_derived = abelianization(parse_endo(config.endo))
    return dict({"matrix": [[str(entry) for entry in row] for row in mat.tolist()],
                 "solvable_images_cyclic": in_derived}), 0

def _freeness(config):
    point = parse_matrices(config.matrices)
    free, witness = freeness_check(list(point), config.length)
    names = tuple(ALPHABET[:len(point)])
    return dict({"length": config.length, "free": free,
                 "witness": None if witness is None else format_word(witness, names)}), \
        0 if free else 1

def _search_periodic(config):
    phi = parse_endo(config.endo)
    ring = make_ring(config.p, config.K, config.tau, config.modulus())
    found = search_periodic(phi, ring, config.strategy, config.nonsingular_only,
                            config.budget, seed=config.seed, workers=config.workers,
                            cap=config.cap)
    points = [dict({"point": [matrix_to_json(mat) for mat in point],
                    "period": period}) for point, period in found]
    return dict({"ring": str(ring), "count": len(points), "points": points}), 0

def _verify_cert(config):
    if config.certificate is None:
        raise InputError("verify-cert needs --certificate.")
    verify_certificate(config.certificate)
    return dict({"verified": True}), 0

COMMANDS = dict({
    "periods": _periods,
    "lift-verify": _lift_verify,
    "separate": _separate,
    "normal-form": _normal_form,
    "injective": _injective,
    "abelianization": _abelianization,
    "freeness": _freeness,
    "search-periodic": _search_periodic,
    "verify-cert": _verify_cert,
})

def run(config):
    """Runs one command; returns (payload, exit code). Pure in @config."""
    LOGGER.info("Running %s with seed %d.", config.command, config.seed)
    payload, code = COMMANDS[config.command](config)
    payload["seed"] = config.seed
    return payload, code

def build_parser():
    """The argparse parser with one subcommand per entry of COMMANDS."""
    parser = argparse.ArgumentParser(prog="spindle", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument("--endo", default=DEFAULT_ENDO)
        sub.add_argument("--matrices", default=DEFAULT_MATRICES)
        sub.add_argument("--p", type=int, default=5)
        sub.add_argument("--tau", type=int, default=1)
        sub.add_argument("--K", type=int,
                         default=1 if name == "search-periodic" else
                         DEFAULT_PRECISION if name == "lift-verify" else 4)
        sub.add_argument("--M", type=int, default=None)
        sub.add_argument("--word", default="")
        sub.add_argument("--length", type=int, default=10)
        sub.add_argument("--strategy", choices=["exhaustive", "from_seeds"],
                         default="exhaustive")
        sub.add_argument("--nonsingular-only", action="store_true")
        sub.add_argument("--search-modulus", action="store_true")
        sub.add_argument("--cap", type=int, default=DEFAULT_CAP)
        sub.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
        sub.add_argument("--budget", type=int, default=10**6)
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sub.add_argument("--workers", type=int, default=1)
        sub.add_argument("--certificate", default=None)
        sub.add_argument("--output", default=None)
    return parser

def config_from_args(args):
    """RunConfig from parsed arguments."""
    return RunConfig(
        command=args.command, endo=args.endo, matrices=args.matrices, p=args.p,
        tau=args.tau, K=args.K, M=args.M, word=args.word, length=args.length,
        strategy=args.strategy, nonsingular_only=args.nonsingular_only,
        search_modulus=args.search_modulus, cap=args.cap,
        order_cap=args.order_cap, budget=args.budget, seed=args.seed,
        workers=args.workers, certificate=args.certificate, output=args.output)

def main(argv=None):
    """Entry point; returns the exit code."""
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr)
    config = config_from_args(args)
    try:
        payload, code = run(config)
    except VerificationFailed as error:
        print(f"verification failed: {error}", file=sys.stderr)
        return 1
    except SpindleError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    text = json.dumps(payload, sort_keys=True, indent=2)
    if config.output is None:
        print(text)
    else:
        with open(config.output, "w") as handle:
            handle.write(text + "\n")
    return code

if __name__ == "__main__":
    sys.exit(main())
