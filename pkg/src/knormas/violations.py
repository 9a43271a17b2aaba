from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One failed well-formedness check; ``where`` names the witnesses."""

    kind: str
    message: str
    where: tuple = ()

    def __str__(self) -> str:
        return self.message


class UnknownSymbolError(LookupError):
    """A formula mentions a nominal or proposition the model does not declare."""
