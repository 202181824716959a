"""
Exact local gamma-factors of G2 x GL_r; `python -m g2_gamma` runs the g2_gamma console script
"""

from g2_gamma.cli import main


if __name__ == '__main__':
    main()
