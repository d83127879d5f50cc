"""Simulation toolkit for microwave-dressed trapped-ion qubits and gates."""

__version__ = "0.1.0"
