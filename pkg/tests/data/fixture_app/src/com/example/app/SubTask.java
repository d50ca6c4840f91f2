package com.example.app;

public class SubTask extends BaseTask {
    public void runTask() {
        prepare();
        execute();
    }
}
