"""Package initialization for src module"""
__version__ = "1.0.0"
__description__ = "Cavity-BEC Dicke model: phase diagram, quantum fluctuations and diffusion rates"
