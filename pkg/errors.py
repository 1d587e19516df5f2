"""
채널 선택 도구 예외 정의
- DataError: 입력/파싱 오류 (CLI 종료 코드 2)
- DomainError: 선택/분류 단계 오류 (CLI 종료 코드 3)
"""


class ChannelSelectionError(ValueError):
    """모든 도구 예외의 기본 클래스"""

    exit_code = 3


class DataError(ChannelSelectionError):
    """입력 파일 또는 데이터셋 구조 오류"""

    exit_code = 2


class DomainError(ChannelSelectionError):
    """선택, 분류, 벤치마크 단계의 오류"""

    exit_code = 3


# ===== 입력/파싱 오류 =====

class MalformedHeader(DataError):
    """헤더 태그 누락/중복/형식 오류"""


class RaggedData(DataError):
    """채널 수 또는 길이가 맞지 않는 인스턴스"""


class UnknownLabel(DataError):
    """선언되지 않은 클래스 라벨"""


class MissingValue(DataError):
    """'?' 결측값"""


class NonFiniteValue(DataError):
    """NaN/Inf 값"""


class MalformedValue(DataError):
    """숫자로 읽을 수 없는 값"""


class IoFailure(DataError):
    """파일 읽기/쓰기 실패"""


class ShapeMismatch(DataError):
    """학습/테스트 데이터의 채널 수 또는 길이 불일치"""


class InvalidDataset(DataError):
    """MtsDataset 불변조건 위반"""


# ===== 도메인 오류 =====

class IndexOutOfRange(DomainError):
    pass


class DuplicateChannel(DomainError):
    pass


class EmptySelection(DomainError):
    pass


class EmptyClass(DomainError):
    pass


class EmptyScores(DomainError):
    pass


class NonFiniteScore(DomainError):
    pass


class UnknownStrategy(DomainError):
    pass


class UnknownClassifier(DomainError):
    pass


class UnknownPrototype(DomainError):
    pass


class InsufficientInstances(DomainError):
    pass


class TooShortSeries(DomainError):
    pass


class SingleClass(DomainError):
    pass


class InvalidSpec(DomainError):
    pass


class EmptyInput(DomainError):
    pass


def describe(error: BaseException) -> str:
    """CLI stderr 출력용 메시지: '<예외이름>: <내용>'"""
    return f"{type(error).__name__}: {error}"
