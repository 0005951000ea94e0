
import sys
from pathlib import Path

# 将项目根目录添加到 Python 路径中
# 这使得我们可以使用绝对导入，例如 from distinction.cli import main
project_root = Path(__file__).parent
sys.path.append(str(project_root))

from distinction.cli import main

if __name__ == "__main__":
    sys.exit(main())
