from .figures import (
    FigureSpec,
    SchemaError,
    render_eop_figure,
    render_runtime_table,
    runtime_pivot,
    series_means,
)

__version__ = "0.1.0"
