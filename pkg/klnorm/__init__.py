"""
klnorm
Normalização de frequências inteiras com divergência KL mínima, heurísticas de codecs
para comparação e ferramentas de validação.
"""
__version__ = "0.1.0"
