import re
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import orjson
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from groups.words import Word, format_word
from pipeline.errors import GroupError

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


class GroupPresentation(BaseModel):
    """Generators 1..generators and relators over signed generator ids."""

    model_config = ConfigDict(frozen=True)

    generators: int = Field(ge=0)
    relators: Tuple[Word, ...] = ()
    names: Optional[Tuple[str, ...]] = None

    @model_validator(mode="after")
    def _check_letters(self) -> "GroupPresentation":
        for relator in self.relators:
            for letter in relator:
                if letter == 0 or abs(letter) > self.generators:
                    raise ValueError(
                        f"Relator letter {letter} outside 1..{self.generators}"
                    )
        if self.names is not None and len(self.names) != self.generators:
            raise ValueError("names must give one name per generator")
        return self

    @property
    def generator_names(self) -> Tuple[str, ...]:
        if self.names is not None:
            return self.names
        return tuple(f"g{i}" for i in range(1, self.generators + 1))

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def size_key(self) -> Tuple[int, int, int]:
        """Ordering used to pick the smallest of several presentations."""
        return (self.generators, len(self.relators), self.total_length)

    def to_text(self) -> str:
        names = self.generator_names
        gens = ", ".join(names)
        rels = ", ".join(format_word(r, names) for r in self.relators)
        return f"< {gens} | {rels} >".replace("<  |", "< |").replace("|  >", "| >")

    def to_jsonable(self) -> Dict[str, Any]:
        return {
            "generators": list(self.generator_names),
            "relators": [list(r) for r in self.relators],
        }

    def to_json(self) -> bytes:
        return orjson.dumps(self.to_jsonable())

    @classmethod
    def from_jsonable(cls, data: Dict[str, Any]) -> "GroupPresentation":
        try:
            names = tuple(str(n) for n in data["generators"])
            relators = tuple(tuple(int(x) for x in r) for r in data["relators"])
            return cls(generators=len(names), relators=relators, names=names)
        except (KeyError, TypeError, ValueError) as e:
            raise GroupError(f"Invalid presentation JSON: {e}") from e

    @classmethod
    def from_text(cls, text: str) -> "GroupPresentation":
        """Parse `< a, b | a b a^-1 b^-1 >`; `1` stands for the empty relator."""
        body = text.strip()
        if not (body.startswith("<") and body.endswith(">")) or body.count("|") != 1:
            raise GroupError(f"Malformed presentation: {text!r}")
        gen_part, rel_part = body[1:-1].split("|")
        names = [n.strip() for n in gen_part.split(",") if n.strip()]
        if len(set(names)) != len(names):
            raise GroupError("Duplicate generator names in presentation")
        index = {name: i + 1 for i, name in enumerate(names)}

        relators: List[Word] = []
        for chunk in rel_part.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            letters: List[int] = []
            for token in chunk.split():
                if token == "1":
                    continue
                match = _TOKEN.match(token)
                if not match or match.group(1) not in index:
                    raise GroupError(f"Unknown token {token!r} in relator {chunk!r}")
                gen = index[match.group(1)]
                power = int(match.group(2) or 1)
                letters.extend([gen if power > 0 else -gen] * abs(power))
            relators.append(tuple(letters))
        return cls(generators=len(names), relators=tuple(relators), names=tuple(names))


class AbelianGroup(BaseModel):
    """Z^rank + Z/d1 + ... + Z/dk with d1 | d2 | ... | dk, each at least 2."""

    model_config = ConfigDict(frozen=True)

    rank: int = Field(ge=0)
    torsion: Tuple[int, ...] = ()

    @field_validator("torsion")
    @classmethod
    def _divisibility_chain(cls, torsion: Tuple[int, ...]) -> Tuple[int, ...]:
        for d in torsion:
            if d < 2:
                raise ValueError(f"Torsion coefficient {d} must be at least 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError(f"Torsion {torsion} is not a divisibility chain")
        return torsion

    @classmethod
    def from_diagonal(cls, generators: int, diagonal: Iterable[int]) -> "AbelianGroup":
        """Group presented by `generators` and a Smith diagonal of nonzero entries."""
        diagonal = [abs(d) for d in diagonal]
        return cls(
            rank=generators - len(diagonal),
            torsion=tuple(d for d in diagonal if d > 1),
        )

    @classmethod
    def from_string(cls, text: str) -> "AbelianGroup":
        text = text.strip()
        if text == "0":
            return cls(rank=0)
        rank = 0
        torsion: List[int] = []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                torsion.append(int(part[2:]))
            else:
                raise GroupError(f"Cannot parse abelian group {text!r}")
        return cls(rank=rank, torsion=tuple(torsion))

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.rank, self.torsion)

    def __str__(self) -> str:
        parts: List[str] = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_jsonable(self) -> Dict[str, Any]:
        return {"rank": self.rank, "torsion": list(self.torsion)}


Invariant = FrozenSet[AbelianGroup]


def sorted_invariant(invariant: Iterable[AbelianGroup]) -> List[AbelianGroup]:
    return sorted(invariant, key=AbelianGroup.sort_key)


def format_invariant(invariant: Iterable[AbelianGroup]) -> str:
    """Deterministic rendering such as `{Z, Z + Z/3}`."""
    return "{" + ", ".join(str(a) for a in sorted_invariant(invariant)) + "}"


def invariant_to_jsonable(invariant: Iterable[AbelianGroup]) -> List[Dict[str, Any]]:
    return [a.to_jsonable() for a in sorted_invariant(invariant)]


def invariant_from_jsonable(data: Iterable[Dict[str, Any]]) -> Invariant:
    return frozenset(
        AbelianGroup(rank=d["rank"], torsion=tuple(d["torsion"])) for d in data
    )
