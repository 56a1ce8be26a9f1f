import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from liesim.pauli import PauliString

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pauli_strings(n):
    return st.text(alphabet="IXYZ", min_size=n, max_size=n).map(PauliString.from_text)


@st.composite
def pauli_pairs(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    return draw(pauli_strings(n)), draw(pauli_strings(n))
