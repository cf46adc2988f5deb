import numpy as np
from hypothesis import strategies as st


@st.composite
def disc_points(draw, max_modulus=0.95):
    r = draw(st.floats(0.0, max_modulus))
    t = draw(st.floats(0.0, 2 * np.pi))
    return complex(r * np.cos(t), r * np.sin(t))


@st.composite
def separated_sequences(draw, min_size=2, max_size=6, max_modulus=0.9, min_rho=0.2):
    from prescribed_zeros.geometry import pseudo_distance

    n = draw(st.integers(min_size, max_size))
    pts = []
    for _ in range(n):
        z = draw(disc_points(max_modulus))
        if all(pseudo_distance(z, w) > min_rho for w in pts):
            pts.append(z)
    return pts
