from enum import Enum as PyEnum


# ------------------------------------------------------------
# ENUM
# ------------------------------------------------------------

class FlavorEnum(PyEnum):
    wheel_free = "wheel_free"
    wheeled_a = "wheeled_a"
    wheeled_b = "wheeled_b"

    @property
    def is_wheeled(self) -> bool:
        return self is not FlavorEnum.wheel_free

    @property
    def allows_loop(self) -> bool:
        return self is FlavorEnum.wheeled_a

    @classmethod
    def parse(cls, value: str) -> "FlavorEnum":
        # CLI shorthands: Γ as "G"/"gamma", 𝒜 as "A", ℬ as "B"
        aliases = {
            "g": cls.wheel_free,
            "gamma": cls.wheel_free,
            "wheelfree": cls.wheel_free,
            "a": cls.wheeled_a,
            "wheeleda": cls.wheeled_a,
            "b": cls.wheeled_b,
            "wheeledb": cls.wheeled_b,
        }
        key = value.strip().lower().replace("_", "").replace("-", "")
        if key in aliases:
            return aliases[key]
        return cls(value)


class SubgraphKindEnum(PyEnum):
    edge = "edge"
    corolla = "corolla"
    span = "span"
    loop = "loop"


class MorphismClassEnum(PyEnum):
    isomorphism = "isomorphism"
    codegeneracy = "codegeneracy"
    inner_coface = "inner_coface"
    outer_coface = "outer_coface"
    exceptional_inner_coface = "exceptional_inner_coface"
    composite = "composite"


class CheckStatusEnum(PyEnum):
    passed = "pass"
    failed = "fail"


# Table models
from .catalog_entries import CatalogEntry  # noqa: E402
