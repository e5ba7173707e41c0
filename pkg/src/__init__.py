"""
Hyperpower Inverse Toolkit - Core Package
"""

__version__ = "0.3.0"
__description__ = "Hyperpower iterations for outer, Moore-Penrose and Drazin inverses"
