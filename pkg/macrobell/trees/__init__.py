from .tree_utils import FamilyRenderer, OperatorFamily, OperatorSequence, TreeUtils
