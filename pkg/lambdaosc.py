#!/usr/bin/env python3
"""
lambdaosc: classical and quantum λ-deformed nonlinear oscillators.

    lambdaosc simulate --model ml1d --lambda 0.3 --x0 1 --t-end 50
    lambdaosc spectrum1d --beta 1 --lambda -0.2 --levels 5
    lambdaosc verify --html verify.html
"""

from src.core.cli import main, run

__all__ = ['main', 'run']

if __name__ == '__main__':
    main()
