from surfarea.fields.analytic import (
    ScalarField,
    Smoothness,
    VectorField3,
    graph_embedding,
)
from surfarea.fields.field_registry import builtin, list_fields, parse_field_spec
