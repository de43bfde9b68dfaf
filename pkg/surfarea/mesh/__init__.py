from surfarea.mesh.triangulation import Triangulation, check_face_to_face
from surfarea.mesh.generators import (
    LanternMesh,
    aniso_band,
    aniso_band_count,
    aniso_strip_count,
    generate_aniso,
    generate_lantern,
    generate_rectangle,
    generate_uniform,
    iter_aniso_bands,
    lantern_parameter_mesh,
)
from surfarea.mesh.off_io import read_off, write_off
from surfarea.mesh.quality import mesh_condition_summary
