"""Configuration utilities for the localisation workbench."""

import os
import re
from dataclasses import asdict, dataclass, fields, replace
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

_ENV_PATTERN = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}")


def load_config(config_file: str) -> Dict[str, Any]:
    """Load configuration with environment variable substitution.

    ``${NAME}`` is replaced by the environment value, ``${NAME:-default}``
    falls back to ``default`` when the variable is unset.

    Args:
        config_file: Path to the YAML configuration file

    Returns:
        Dictionary with configuration values
    """
    env_path = Path(".env")
    if env_path.exists():
        load_dotenv(env_path)

    with open(config_file, encoding="utf-8") as f:
        content = f.read()

    def substitute(match: "re.Match[str]") -> str:
        name, default = match.group(1), match.group(2)
        return os.environ.get(name, default if default is not None else match.group(0))

    return yaml.safe_load(_ENV_PATTERN.sub(substitute, content)) or {}


@dataclass(frozen=True)
class Budgets:
    """Explicit resource limits handed to every bounded computation."""

    morphism_cap: int = 10000
    roof_cap: int = 1000000
    max_cosets: int = 100000
    quotient_degree: int = 5
    quotient_checks: int = 200000
    kb_max_rules: int = 500
    kb_max_rounds: int = 50
    word_length: int = 16
    poset_bound: int = 3
    envelope_k: int = 3

    @classmethod
    def from_config(cls, cfg: Optional[Dict[str, Any]]) -> "Budgets":
        """Build budgets from the ``budgets`` mapping of a loaded config.

        Args:
            cfg: Full configuration dictionary (may be None)

        Returns:
            Budgets with unknown keys ignored and missing keys defaulted
        """
        section = (cfg or {}).get("budgets") or {}
        known = {f.name for f in fields(cls)}
        return cls(**{k: int(v) for k, v in section.items() if k in known})

    def override(self, **values: Optional[int]) -> "Budgets":
        """Return a copy with every non-None value replaced."""
        return replace(self, **{k: int(v) for k, v in values.items() if v is not None})

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


def generate_file_name(params: Dict[str, Any], file_type: str, extension: str) -> str:
    """Generate a standardized file name with all relevant parameters.

    Args:
        params: Run parameters (command, setup, seed, ...)
        file_type: Type of file (report/log/bundle)
        extension: File extension without dot

    Returns:
        Formatted file name with parameters
    """
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    parts = []

    if params.get("command"):
        parts.append(str(params["command"]).replace(" ", "-"))
    if params.get("setup"):
        parts.append(f"setup_{params['setup']}")
    if params.get("hypothesis"):
        parts.append(f"hyp_{params['hypothesis']}")
    if params.get("seed") is not None:
        parts.append(f"seed{params['seed']}")

    suffix = "_".join(re.sub(r"[^A-Za-z0-9_.-]", "-", p) for p in parts)
    return f"{file_type}_{timestamp}_{suffix}.{extension}" if suffix else f"{file_type}_{timestamp}.{extension}"
