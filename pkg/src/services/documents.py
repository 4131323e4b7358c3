"""
Reading and writing versioned documents: a header line followed by JSON.
"""

import logging
from pathlib import Path
from typing import TypeVar

from pydantic import BaseModel, ValidationError

from src.config.config import DOC_HEADER
from src.services.exceptions import ParseError

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)


def dumps(document: BaseModel) -> str:
    return f"{DOC_HEADER}\n{document.model_dump_json(indent=2)}\n"


def loads(text: str, model: type[Model]) -> Model:
    """
    Parses a document and validates it against ``model``.

    Args:
    - text (str): The header line, then one JSON object.
    - model (type[BaseModel]): The schema.

    Returns:
    - BaseModel: The validated document.
    """
    header, _, body = text.partition("\n")
    if header.strip() != DOC_HEADER:
        raise ParseError(f"expected the header {DOC_HEADER!r}, got {header.strip()!r}")
    try:
        return model.model_validate_json(body)
    except ValidationError as err:
        raise ParseError(f"invalid {model.__name__}: {err}") from err


def read(path: str | Path, model: type[Model]) -> Model:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    logger.debug("read %s from %s", model.__name__, path)
    return loads(text, model)


def write(path: str | Path, document: BaseModel):
    Path(path).write_text(dumps(document), encoding="utf-8")
