"""Figure panels for pxpfsa CSV output."""

from .render import PanelSpec, render
from .schema import (EmptyTableError, FigureDataError, MissingColumnError,
                     TARGET_SCHEMAS, load_table)

__all__ = ["PanelSpec", "render", "EmptyTableError", "FigureDataError",
           "MissingColumnError", "TARGET_SCHEMAS", "load_table"]
