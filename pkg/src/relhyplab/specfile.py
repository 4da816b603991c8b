"""Group-spec config files and the inline word syntax.

The config format is line-based ``key = value`` with ``#`` comments:

    family      = free_product
    factors     = Z, Z
    generators  = a, b
    peripherals = factor:0, factor:1
    relator     = ( a b )^7        # only for one_relator_quotient

Families: ``free`` (rank = number of generators), ``free_abelian``,
``free_product``, ``one_relator_quotient``.  Factors: ``Z``, ``Z^m``,
``Z/k``, ``F(r)``.  Peripherals are listed in lambda order as
``factor:i`` or ``axis:i``.

Words use space-separated tokens: a generator name with an optional
integer power (``a``, ``b^-3``), a peripheral letter ``lam:payload``
(payload is the intrinsic encoding: an exponent, a residue, a comma
list for exponent vectors or signed generator indices of free factors),
and parenthesized repetition ``( a b )^7``.  The same parser backs every
CLI subcommand and service endpoint.
"""

from __future__ import annotations

from typing import Dict, List

from .errors import ConfigParseError
from .groups import (
    AbelianFactor,
    CyclicFactor,
    Factor,
    FreeAbelianFamily,
    FreeFactor,
    FreeGroupFamily,
    FreeProductFamily,
    GroupSpec,
    OneRelatorQuotient,
    Peripheral,
)
from .words import HLetter, Letter, Word, XLetter


def parse_factor(text: str) -> Factor:
    t = text.strip()
    if t == "Z":
        return AbelianFactor(1)
    if t.startswith("Z^"):
        try:
            return AbelianFactor(int(t[2:]))
        except ValueError:
            raise ConfigParseError(f"bad factor {text!r}") from None
    if t.startswith("Z/"):
        try:
            k = int(t[2:])
        except ValueError:
            raise ConfigParseError(f"bad factor {text!r}") from None
        if k < 2:
            raise ConfigParseError(f"cyclic factor needs modulus >= 2, got {text!r}")
        return CyclicFactor(k)
    if t.startswith("F(") and t.endswith(")"):
        try:
            return FreeFactor(int(t[2:-1]))
        except ValueError:
            raise ConfigParseError(f"bad factor {text!r}") from None
    if t.startswith("F") and t[1:].isdigit():
        return FreeFactor(int(t[1:]))
    raise ConfigParseError(f"unknown factor {text!r}")


def format_factor(f: Factor) -> str:
    if isinstance(f, AbelianFactor):
        return "Z" if f.rank == 1 else f"Z^{f.rank}"
    if isinstance(f, CyclicFactor):
        return f"Z/{f.modulus}"
    return f"F({f.rank})"


def _split_list(value: str) -> List[str]:
    return [p.strip() for p in value.split(",") if p.strip()]


def parse_spec_mapping(fields: Dict[str, str]) -> GroupSpec:
    """Build a GroupSpec from the config key/value mapping."""
    if "family" not in fields:
        raise ConfigParseError("missing 'family'")
    family_name = fields["family"].strip()
    gens = tuple(_split_list(fields.get("generators", "")))
    periph_specs = _split_list(fields.get("peripherals", ""))

    peripherals = []
    for lam, ptext in enumerate(periph_specs):
        if ":" not in ptext:
            raise ConfigParseError(f"bad peripheral {ptext!r} (want kind:index)")
        kind, _, idx = ptext.partition(":")
        try:
            peripherals.append(Peripheral(lam, kind.strip(), int(idx)))
        except ValueError:
            raise ConfigParseError(f"bad peripheral index in {ptext!r}") from None

    try:
        if family_name == "free":
            return GroupSpec(FreeGroupFamily(len(gens)), gens, tuple(peripherals))
        if family_name == "free_abelian":
            return GroupSpec(FreeAbelianFamily(len(gens)), gens, tuple(peripherals))
        factors = tuple(parse_factor(t) for t in _split_list(fields.get("factors", "")))
        if not factors:
            raise ConfigParseError(f"family {family_name!r} needs 'factors'")
        if family_name == "free_product":
            return GroupSpec(FreeProductFamily(factors), gens, tuple(peripherals))
        if family_name == "one_relator_quotient":
            if not fields.get("relator", "").strip():
                raise ConfigParseError("one_relator_quotient needs 'relator'")
            fp = GroupSpec(FreeProductFamily(factors), gens, tuple(peripherals))
            relator = fp.element_of_word(parse_word(fp, fields["relator"]))
            if relator == ():
                raise ConfigParseError("relator is trivial in the free product")
            return GroupSpec(OneRelatorQuotient(factors, relator), gens,
                             tuple(peripherals))
    except ConfigParseError:
        raise
    except Exception as exc:  # invalid generator counts etc. surface verbatim
        raise ConfigParseError(str(exc)) from exc
    raise ConfigParseError(f"unknown family {family_name!r}")


def parse_spec_text(text: str) -> GroupSpec:
    fields: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    return parse_spec_mapping(fields)


def parse_spec_file(path) -> GroupSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_spec_text(fh.read())
    except OSError as exc:
        raise ConfigParseError(f"cannot read spec file {path}: {exc}") from exc


def spec_mapping(spec: GroupSpec) -> Dict[str, str]:
    """Inverse of parse_spec_mapping, used by reports."""
    fam = spec.family
    out: Dict[str, str] = {"generators": ", ".join(spec.gen_names)}
    periph = ", ".join(f"{p.kind}:{p.index}" for p in spec.peripherals)
    if periph:
        out["peripherals"] = periph
    if isinstance(fam, FreeGroupFamily):
        out["family"] = "free"
    elif isinstance(fam, FreeAbelianFamily):
        out["family"] = "free_abelian"
    elif isinstance(fam, FreeProductFamily):
        out["family"] = "free_product"
        out["factors"] = ", ".join(format_factor(f) for f in fam.factors)
    else:
        out["family"] = "one_relator_quotient"
        out["factors"] = ", ".join(format_factor(f) for f in fam.factors)
        from .words import format_word

        fp = GroupSpec(FreeProductFamily(fam.factors), spec.gen_names, spec.peripherals)
        out["relator"] = format_word(fp.canonical_word(fam.relator))
    return out


# ---------------------------------------------------------------------------
# inline word syntax


def _parse_payload(text: str):
    parts = text.split(",")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise ConfigParseError(f"bad peripheral payload {text!r}") from None
    return vals[0] if len(vals) == 1 else tuple(vals)


def _invert_letters(spec: GroupSpec, letters: List[Letter]) -> List[Letter]:
    out: List[Letter] = []
    for letter in reversed(letters):
        if isinstance(letter, XLetter):
            out.append(XLetter(letter.name, -letter.sign))
        else:
            out.append(HLetter(letter.lam, spec.payload_inverse(letter.lam, letter.payload)))
    return out


def parse_word(spec: GroupSpec, text: str) -> Word:
    """Parse the inline word syntax against a spec (names and payloads
    are validated when the word is later normalized)."""
    tokens = text.split()
    pos = 0

    def parse_seq(depth: int) -> List[Letter]:
        nonlocal pos
        out: List[Letter] = []
        while pos < len(tokens):
            tok = tokens[pos]
            if tok == "(":
                pos += 1
                inner = parse_seq(depth + 1)
                if pos >= len(tokens) or not tokens[pos].startswith(")"):
                    raise ConfigParseError("unclosed '(' in word")
                closer = tokens[pos]
                pos += 1
                power = 1
                if closer.startswith(")^"):
                    try:
                        power = int(closer[2:])
                    except ValueError:
                        raise ConfigParseError(f"bad repetition {closer!r}") from None
                elif closer != ")":
                    raise ConfigParseError(f"bad token {closer!r}")
                block = inner if power >= 0 else _invert_letters(spec, inner)
                for _ in range(abs(power)):
                    out.extend(block)
                continue
            if tok.startswith(")"):
                if depth == 0:
                    raise ConfigParseError("unmatched ')' in word")
                return out
            pos += 1
            if tok == "1":
                continue
            if ":" in tok and tok.split(":", 1)[0].isdigit():
                lam_text, _, payload_text = tok.partition(":")
                out.append(HLetter(int(lam_text), _parse_payload(payload_text)))
                continue
            name, _, exp_text = tok.partition("^")
            power = 1
            if exp_text:
                try:
                    power = int(exp_text)
                except ValueError:
                    raise ConfigParseError(f"bad power in token {tok!r}") from None
            if power == 0:
                continue
            sign = 1 if power > 0 else -1
            out.extend(XLetter(name, sign) for _ in range(abs(power)))
        if depth != 0:
            raise ConfigParseError("unclosed '(' in word")
        return out

    letters = parse_seq(0)
    return tuple(letters)
