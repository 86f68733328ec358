"""
整数关系检测与编目恒等式
"""

from .pslq import IntegerRelation, NoRelation, RelationProblem, pslq
from .identities import Identity, IdentityManager, get_identity_manager, integer_vector
from .verify import IdentityCheck, IdentityReport, check_identity, verify_catalog_identities

__all__ = [
    'RelationProblem', 'IntegerRelation', 'NoRelation', 'pslq',
    'Identity', 'IdentityManager', 'get_identity_manager', 'integer_vector',
    'IdentityCheck', 'IdentityReport', 'check_identity', 'verify_catalog_identities',
]
