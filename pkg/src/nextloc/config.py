"""Pipeline configuration: key=value file with CLI flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    records: str = "records.csv"
    train: str = "train.jsonl"
    test: str = "test.jsonl"
    graphs: str = "graphs.csv"
    table: str = "table.csv"
    markov: str = "markov.csv"
    results: str = "results.csv"
    slot_seconds: int = 86400
    gap: int = 1800
    min_len: int = 3
    train_fraction: float = 0.8
    seed: int = 7
    lam: float = 0.3
    f: str = "reciprocal"
    epsilon: float = 1.0
    r: tuple[int, ...] = (1, 2, 3, 4, 5)

    def validate(self) -> None:
        if self.slot_seconds <= 0 or 86400 % self.slot_seconds != 0:
            raise ConfigError(f"slot_seconds: must divide 86400, got {self.slot_seconds}")
        if self.gap <= 0:
            raise ConfigError(f"gap: must be positive, got {self.gap}")
        if self.min_len < 1:
            raise ConfigError(f"min_len: must be >= 1, got {self.min_len}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction: must be in (0, 1), got {self.train_fraction}")
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError(f"lambda: must be in [0, 1], got {self.lam}")
        if self.f not in ("reciprocal", "exp"):
            raise ConfigError(f"f: must be 'reciprocal' or 'exp', got {self.f!r}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon: must be positive, got {self.epsilon}")
        if not self.r or any(r < 1 for r in self.r):
            raise ConfigError(f"r: all cutoffs must be >= 1, got {self.r}")


# file/flag key -> dataclass field ("lambda" is a Python keyword)
_KEY_TO_FIELD = {f.name: f.name for f in fields(PipelineConfig)} | {"lambda": "lam"}


def parse_r_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"r: expected comma-separated integers, got {text!r}") from None


def _coerce(field_name: str, raw: str):
    if field_name in ("slot_seconds", "gap", "min_len", "seed"):
        return int(raw)
    if field_name in ("train_fraction", "lam", "epsilon"):
        return float(raw)
    if field_name == "r":
        return parse_r_list(raw)
    return raw


def load_config(path) -> PipelineConfig:
    """Read ``key=value`` lines ('#' comments, blank lines allowed) into a config."""
    config = PipelineConfig()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path} line {lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key, raw = key.strip(), raw.strip()
            field_name = _KEY_TO_FIELD.get(key)
            if field_name is None:
                raise ConfigError(f"{path} line {lineno}: unknown key {key!r}")
            try:
                setattr(config, field_name, _coerce(field_name, raw))
            except ValueError:
                raise ConfigError(f"{path} line {lineno}: bad value for {key}: {raw!r}") from None
    return config
