package corpus;

import java.util.HashMap;
import java.util.Map;

public class MultiFields {
    int a, b;
    int c = 1, d = 2, e;
    int[] f, g[];
    int h[] = {1, 2, 3}, i;
    private Map<String, Integer> counts = new HashMap<String, Integer>(16, 0.75f), backup;
    static final long X = 1L << 3, Y = X >> 1;
}
