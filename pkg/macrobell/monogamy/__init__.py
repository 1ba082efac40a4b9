from .monogamy_utils import ExpectationVector, FamilyBound, MonogamyUtils, VisibilityCap, \
    WernerCategory, WernerClassification, POVM_THRESHOLD, PROJECTIVE_THRESHOLD
