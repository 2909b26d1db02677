"""Exception hierarchy shared by the codec and the CLI."""


class HuffreError(Exception):
    """Base class for every error raised by huffre."""


class InputDomainError(HuffreError, ValueError):
    """Input symbols or parameters fall outside the accepted domain."""


class StructuralError(HuffreError, ValueError):
    """Two objects that must agree in shape do not."""


class CapacityError(HuffreError):
    """A codeword or configuration does not fit in the encoder word width."""


class CorruptStreamError(HuffreError):
    """An encoded stream or archive failed validation while decoding.

    ``bit_offset`` is the position within the chunk payload where decoding
    stopped, when known.
    """

    def __init__(self, message, *, chunk=None, bit_offset=None):
        super().__init__(message)
        self.chunk = chunk
        self.bit_offset = bit_offset
