from .scalar import *
from .rep import *
from .coord import *
from .action import *
from .report import *
