"""
padroes132: funções geradoras de permutações que evitam 1-3-2 e
restrições por padrões generalizados, com verificação por enumeração.
"""
__version__ = "0.1.0"
