"""Input validation helpers shared by the estimator, harness and service."""

from __future__ import annotations

from typing import Sequence


def check_token(token: object, name: str = "token") -> str:
    if not isinstance(token, str) or not token:
        raise ValueError(f"{name} must be a non-empty string, got {token!r}")
    if any(ch.isspace() for ch in token):
        raise ValueError(f"{name} must not contain whitespace: {token!r}")
    return token


def check_morphemes(morphemes: object, name: str = "morphemes") -> tuple[str, ...]:
    if isinstance(morphemes, str) or not isinstance(morphemes, Sequence) or not morphemes:
        raise ValueError(f"{name} must be a non-empty sequence of strings, got {morphemes!r}")
    out = tuple(morphemes)
    if not all(isinstance(m, str) and m for m in out):
        raise ValueError(f"{name} must contain non-empty strings, got {morphemes!r}")
    return out


def check_X_y(X: Sequence, y: Sequence) -> tuple[list[str], list[tuple[str, ...]]]:
    """Validate parallel token / morpheme-sequence training inputs."""
    if len(X) != len(y):
        raise ValueError(f"X and y must have equal length, got {len(X)} and {len(y)}")
    if len(X) == 0:
        raise ValueError("training set must be non-empty")
    tokens = [check_token(x, f"X[{i}]") for i, x in enumerate(X)]
    seqs = [check_morphemes(seq, f"y[{i}]") for i, seq in enumerate(y)]
    return tokens, seqs
