# Plasmonic beamsplitter QRNG simulator and randomness test pipeline

__version__ = "0.1.0"
