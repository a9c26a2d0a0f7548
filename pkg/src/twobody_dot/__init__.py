"""Two charged particles in an axially symmetric parabolic trap in a magnetic field."""
