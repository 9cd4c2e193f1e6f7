"""Access to the bundled catalogs and the case-study fixture workspace."""

from __future__ import annotations

import shutil
from importlib import resources
from pathlib import Path

from ctm2.model import MaturityModel, parse_model

DEFAULT_CATALOG_ID = "icsctm2-default"
CASESTUDY_CATALOG_ID = "icsctm2-casestudy"


def _data_root() -> Path:
    return Path(str(resources.files("ctm2") / "data"))


def catalog_bytes(catalog_id: str) -> bytes:
    return (_data_root() / "catalogs" / f"{catalog_id}.json").read_bytes()


def default_catalog() -> MaturityModel:
    return parse_model(catalog_bytes(DEFAULT_CATALOG_ID))


def casestudy_catalog() -> MaturityModel:
    return parse_model(catalog_bytes(CASESTUDY_CATALOG_ID))


def casestudy_workspace_root() -> Path:
    """Read-only path of the bundled case-study workspace (1 catalog, 8 assessments)."""
    return _data_root() / "fixtures" / "casestudy"


def materialize_casestudy(dest: Path | str) -> Path:
    """Copy the case-study workspace somewhere writable; returns the copy root."""
    dest = Path(dest)
    shutil.copytree(casestudy_workspace_root(), dest, dirs_exist_ok=True)
    return dest
