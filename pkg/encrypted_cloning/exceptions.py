class DenseLimitError(ValueError):
    """Raised when an operator would exceed the dense-path qubit ceiling."""

    def __init__(self, num_qubits, limit):
        self.num_qubits = num_qubits
        self.limit = limit
        super().__init__(
            f"dense representation of {num_qubits} qubits exceeds the limit of "
            f"{limit} qubits (set QEC_DENSE_LIMIT to raise it)",
        )


class LabelError(ValueError):
    """Raised for qubit-label problems: mismatch, collision or bad subset token."""

    def __init__(self, message, token=None):
        self.token = token
        super().__init__(message)


class AffinityError(ArithmeticError):
    """Raised when a reduced state is not affine in the Bloch components."""
