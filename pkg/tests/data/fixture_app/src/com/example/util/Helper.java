package com.example.util;

import com.example.app.SubTask;

public class Helper {
    public static String format(String input) {
        return "[" + input + "]";
    }

    public static SubTask adapt(int aVeryLongIdentifierNameThatKeepsGoingOn) {
        SubTask made = new SubTask();
        made.runTask();
        return made;
    }

    static class Inner {
        int pick(int a, int b, int c, int d, int e, int f, int g) {
            return a + b + c + d + e + f + g;
        }
    }
}
