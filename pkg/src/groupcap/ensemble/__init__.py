"""Random shifted-homomorphism codes: encoding, decoding, simulation, exact checks."""
